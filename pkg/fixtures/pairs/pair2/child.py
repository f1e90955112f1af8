import rospy
import smach

from robot_skills.arm import CarryPose, PoseArm
from robot_skills.gripper import CloseGripper, DetectHandover
from robot_skills.speech import Say


class HandoverFromHuman(smach.StateMachine):
    """Receive an object from a human by detecting the handover directly."""

    def __init__(self, robot, arm_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('POSE_ARM',
                                   PoseArm(robot, arm_designator, 'receive'),
                                   transitions={'posed': 'DETECT_HANDOVER',
                                                'failed': 'failed'})

            smach.StateMachine.add('DETECT_HANDOVER',
                                   DetectHandover(robot, arm_designator, timeout=15.0),
                                   transitions={'detected': 'CLOSE_GRIPPER',
                                                'timeout': 'POSE_ARM'})

            smach.StateMachine.add('CLOSE_GRIPPER',
                                   CloseGripper(robot, arm_designator),
                                   transitions={'closed': 'CARRY_POSE',
                                                'missed': 'DETECT_HANDOVER',
                                                'failed': 'POSE_ARM'})

            smach.StateMachine.add('CARRY_POSE',
                                   CarryPose(robot, arm_designator),
                                   transitions={'done': 'SAY_END'})

            smach.StateMachine.add('SAY_END',
                                   Say(robot, 'Thank you, I have the object.'),
                                   transitions={'spoken': 'succeeded'})


if __name__ == '__main__':
    rospy.init_node('handover_from_human')
    sm = HandoverFromHuman(None, None)
    sm.execute()
