import rospy
import smach


class OpenGripper(smach.State):
    """Open the gripper of the designated arm."""

    def __init__(self, robot, arm_designator):
        smach.State.__init__(self, outcomes=['opened', 'stuck'])
        self.robot = robot
        self.arm_designator = arm_designator

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if not arm.send_gripper_goal('open', timeout=5.0):
            return 'stuck'
        return 'opened'


class CloseGripper(smach.State):
    """Close the gripper and check whether something was grasped."""

    def __init__(self, robot, arm_designator):
        smach.State.__init__(self, outcomes=['closed', 'missed', 'failed'])
        self.robot = robot
        self.arm_designator = arm_designator

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if not arm.send_gripper_goal('close', timeout=5.0):
            return 'failed'
        if arm.gripper_measurement.is_empty:
            return 'missed'
        return 'closed'


class WaitForGrasp(smach.State):
    """Wait until force sensing reports an object between the fingers."""

    def __init__(self, robot, arm_designator, timeout=10.0):
        smach.State.__init__(self, outcomes=['grasped', 'timeout'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.timeout = timeout

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        deadline = rospy.Time.now() + rospy.Duration(self.timeout)
        while rospy.Time.now() < deadline:
            if arm.force_sensor.object_present():
                return 'grasped'
            rospy.sleep(0.2)
        return 'timeout'
