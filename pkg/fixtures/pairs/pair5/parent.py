import rospy
import smach

from robot_skills.arm import MoveToJointGoal, UnlockArm
from robot_skills.handover import CloseGripperHandover, DetectHandover


class HandoverToHuman(smach.StateMachine):
    """Hand the held object over to a human."""

    def __init__(self, robot, arm_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('UNLOCK_ARM',
                                   UnlockArm(robot, arm_designator),
                                   transitions={'unlocked': 'MOVE_HUMAN_HANDOVER_JOINT_GOAL'})

            smach.StateMachine.add('MOVE_HUMAN_HANDOVER_JOINT_GOAL',
                                   MoveToJointGoal(robot, arm_designator,
                                                   'human_handover'),
                                   transitions={'arm_at_goal': 'succeeded',
                                                'goal_unreachable': 'failed'})

            smach.StateMachine.add('DETECT_HANDOVER',
                                   DetectHandover(robot, arm_designator),
                                   transitions={'handover_detected': 'succeeded',
                                                'timeout': 'failed'})

            smach.StateMachine.add('CLOSE_GRIPPER_HANDOVER',
                                   CloseGripperHandover(robot, arm_designator),
                                   transitions={'gripper_closed': 'succeeded'})


if __name__ == '__main__':
    rospy.init_node('handover_to_human')
    sm = HandoverToHuman(None, None)
    sm.execute()
